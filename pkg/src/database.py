import datetime
import json
import os

from loguru import logger
from sqlalchemy import Column, DateTime, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

Base = declarative_base()


class Run(Base):
    __tablename__ = 'runs'
    id = Column(Integer, primary_key=True)
    command = Column(String(100), nullable=False)
    seed = Column(Integer, nullable=False)
    version = Column(String(20), nullable=False)
    exit_code = Column(Integer, nullable=False)
    summary = Column(Text, nullable=True)
    timestamp = Column(DateTime, default=datetime.datetime.utcnow)


class Certification(Base):
    __tablename__ = 'certifications'
    id = Column(Integer, primary_key=True)
    polynomial = Column(Text, nullable=False)
    group_name = Column(String(50), nullable=False)
    max_prime = Column(Integer, nullable=False)
    verdict = Column(String(20), nullable=False)
    primes_sampled = Column(Integer, nullable=False)
    observed = Column(Text, nullable=False)
    timestamp = Column(DateTime, default=datetime.datetime.utcnow)


class Database:
    def __init__(self, db_path):
        """
        Initialize the run ledger
        Args:
            db_path: Path to SQLite database file
        """
        try:
            directory = os.path.dirname(db_path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            self.engine = create_engine(f'sqlite:///{db_path}')
            Base.metadata.create_all(self.engine)
            self.Session = sessionmaker(bind=self.engine)
            logger.debug(f"Run ledger at {db_path}")
        except Exception as e:
            logger.error(f"Failed to initialize database: {e}")
            raise

    def record_run(self, command, seed, version, exit_code, summary=None):
        """
        Store one CLI invocation
        Args:
            command: command name, e.g. 'paper-verify'
            summary: JSON-serialisable summary of the report
        Returns:
            True if successful, False otherwise
        """
        session = self.Session()
        try:
            run = Run(
                command=command,
                seed=seed,
                version=version,
                exit_code=exit_code,
                summary=json.dumps(summary, sort_keys=True) if summary is not None else None
            )
            session.add(run)
            session.commit()
            return True
        except Exception as e:
            logger.error(f"Error recording run {command}: {e}")
            session.rollback()
            return False
        finally:
            session.close()

    def record_certification(self, report):
        """
        Store a CertReport
        Returns:
            True if successful, False otherwise
        """
        session = self.Session()
        try:
            row = Certification(
                polynomial=json.dumps(report.polynomial),
                group_name=report.group,
                max_prime=report.max_prime,
                verdict=report.verdict,
                primes_sampled=report.primes_sampled,
                observed=json.dumps({str(t): c for t, c in report.observed.items()})
            )
            session.add(row)
            session.commit()
            logger.debug(f"Recorded certification of {report.group}: {report.verdict}")
            return True
        except Exception as e:
            logger.error(f"Error recording certification: {e}")
            session.rollback()
            return False
        finally:
            session.close()

    def get_recent_runs(self, limit=20):
        """
        Get recent runs, newest first
        Args:
            limit: Maximum number of runs to return
        """
        session = self.Session()
        try:
            return session.query(Run).order_by(Run.timestamp.desc(), Run.id.desc()).limit(limit).all()
        except Exception as e:
            logger.error(f"Error getting recent runs: {e}")
            return []
        finally:
            session.close()

    def get_certifications(self, verdict=None):
        session = self.Session()
        try:
            query = session.query(Certification)
            if verdict:
                query = query.filter_by(verdict=verdict)
            return query.order_by(Certification.id).all()
        except Exception as e:
            logger.error(f"Error getting certifications: {e}")
            return []
        finally:
            session.close()

    def get_run_stats(self):
        """
        Returns:
            Dictionary with counts of runs, failed runs and certifications
        """
        session = self.Session()
        try:
            return {
                'total_runs': session.query(Run).count(),
                'failed_runs': session.query(Run).filter(Run.exit_code != 0).count(),
                'certifications': session.query(Certification).count()
            }
        except Exception as e:
            logger.error(f"Error getting run stats: {e}")
            return {}
        finally:
            session.close()

    def close(self):
        try:
            self.engine.dispose()
            logger.debug("Database connection closed")
        except Exception as e:
            logger.error(f"Error closing database: {e}")
